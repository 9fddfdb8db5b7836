"""Magnitude-only reconstruction and retrievability certificates.

The core modules work on plain numpy arrays and small frozen dataclasses:

- :mod:`magnilift.graphs`       vector fields on graphs, observations, orbits
- :mod:`magnilift.gram`         polarization and Gram-based rank tests
- :mod:`magnilift.simplex`      simplex graphs and uniqueness certificates
- :mod:`magnilift.reconstruct`  reconstruction from magnitude observations
- :mod:`magnilift.conjugate`    conjugate-equivalence certificates for range spaces
- :mod:`magnilift.splines`      hat-spline magnitude recovery on the half-integer grid
- :mod:`magnilift.quaternions`  quaternion-valued functions and their orbits
- :mod:`magnilift.affine`       affine magnitude systems and injectivity checks
- :mod:`magnilift.generate`     seeded instance generators

``magnilift.service`` exposes the same operations as a FastAPI app and
``magnilift.cli`` is a thin command-line client of the service handlers.
"""

__version__ = "0.1.0"
