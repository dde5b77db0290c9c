"""Exact construction and certification of box-spline prewavelet masks."""
