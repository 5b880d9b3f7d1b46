"""Return words of substitutive shifts and the subgroups they generate."""

__version__ = "0.1.0"
