"""Laboratory for quantifying visual product differentiation in font-like markets.

Pipeline: synthetic pangram bitmaps -> metric embedding (triplet loss CNN)
-> differentiation measures -> foundry panel -> synthetic-control inference.
"""

__version__ = "0.1.0"
