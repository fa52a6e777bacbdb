"""Trigonometric and eight-vertex R-matrices of quantized affine sl(2), their
twistors, and the associated KZ and q-KZ systems in evaluation representations."""

__version__ = "0.1.0"
