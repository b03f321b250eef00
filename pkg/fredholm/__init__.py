"""Newton-type solver for nonlinear Fredholm integral equations of the second kind."""

__version__ = "1.0.0"
