from typing import Any, Optional, Tuple


class GroupEngineError(Exception):
    """Base class for every error raised by the group engine"""


class ConfigError(GroupEngineError):
    """Settings file or environment override could not be applied"""


class GroupSpecError(GroupEngineError):
    """A group-spec document is missing, malformed or carries unknown fields"""


class UnknownCommand(GroupEngineError):
    """Command name is not present in the command catalogue"""


class InvalidParameters(GroupEngineError):
    """Parameters fall outside the hypotheses of the requested operation"""


class ClosureExceedsCap(GroupEngineError):
    def __init__(self, cap: int):
        super().__init__(f"closure grew past the order cap of {cap}")
        self.cap = cap


class InvalidPermutation(GroupEngineError):
    def __init__(self, index: int, images: Any, reason: str = "is not a bijection"):
        shown = list(images) if isinstance(images, (list, tuple)) else images
        super().__init__(f"generator {index} {reason}: {shown!r}")
        self.index = index


class InconsistentPresentation(GroupEngineError):
    """Collection did not terminate or the compiled table is not a group"""


class NotAGroup(GroupEngineError):
    def __init__(self, axiom: str, witness: Optional[Tuple[int, ...]] = None):
        detail = f" at {witness}" if witness is not None else ""
        super().__init__(f"{axiom} fails{detail}")
        self.axiom = axiom
        self.witness = witness


class NotPrimePower(GroupEngineError):
    def __init__(self, order: int, p: int):
        super().__init__(f"order {order} is not a power of {p}")
        self.order = order
        self.p = p


class RecursionDepthExceeded(GroupEngineError):
    """Centralizer recursion did not shrink; the input table is broken"""


class FingerprintMismatch(GroupEngineError):
    def __init__(self, family: str, expected: dict, actual: dict):
        super().__init__(f"{family}: expected {expected}, built {actual}")
        self.family = family
        self.expected = expected
        self.actual = actual


class QuotientTooLarge(GroupEngineError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"central quotient of order {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class TupleCapExceeded(GroupEngineError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"{size} tuples exceed the cap of {cap}")
        self.size = size
        self.cap = cap
