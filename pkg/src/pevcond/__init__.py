"""
pevcond - Condition numbers of real polynomial eigenvalue problems.

This package computes the real polynomial eigenvalues of homogeneous matrix
polynomials, their relative condition numbers, and checks the closed-form
expected condition numbers for Gaussian, GOE and subspace random ensembles
by seeded Monte Carlo.
"""

__version__ = '0.1.0'
