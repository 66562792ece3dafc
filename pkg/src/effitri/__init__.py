"""Normal surfaces, 0-efficiency, crushing and decomposition of closed 3-manifold triangulations."""
__version__ = "0.1.0"
