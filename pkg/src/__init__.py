"""qmi: numerical checks for finite-dimensional quantum measurement theory."""

__version__ = "0.1.0"
