"""Birkhoff-James orthogonality and structure recovery for block C*-algebras."""

from .scalars import Kind, Scalar, BlockVector, inner_product_F
from .blockalg import Algebra, Block, Element, NormFrame, svd, norm_frame, random_element

__all__ = [
    "Kind", "Scalar", "BlockVector", "inner_product_F",
    "Algebra", "Block", "Element", "NormFrame", "svd", "norm_frame", "random_element",
]
