"""Deformation quantization toolkit: Hochschild and polyvector DGLAs, Kontsevich graphs and star products."""

__version__ = "0.1.1"
