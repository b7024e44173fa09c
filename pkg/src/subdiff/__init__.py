"""Outer limits of Frechet subdifferentials for min-max structured functions.

Exact 2-D direction sweep for piecewise-affine data, sampling oracle for the
rest, and error-bound-modulus lower bounds via dist(0, outer limit).
"""
