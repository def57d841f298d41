"""Point transformations of third-order ODE jets, verified exactly."""

__version__ = "0.1.0"
