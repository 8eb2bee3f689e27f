from .unit_frac import UnitFrac, ONE, MASK, FRAC_BITS
from .group_element import GroupElement, ModelKind
from .w_data import WData

__all__ = ["UnitFrac", "ONE", "MASK", "FRAC_BITS", "GroupElement", "ModelKind", "WData"]
