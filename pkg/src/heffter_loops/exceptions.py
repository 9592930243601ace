#
# For licensing see accompanying LICENSE file.
#


class HeffterError(Exception):
    pass


class InputError(HeffterError):
    pass


class PolynomialSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EntryConflictError(InputError):
    pass


class NonAffineDesignError(InputError):
    pass


class UnsupportedBlockSizeError(InputError):
    pass


class SearchTooLargeError(HeffterError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(
            f"Refusing to search {what} of size {size}: cap is {cap}. "
            "Raise the cap explicitly to proceed."
        )
        self.size = size
        self.cap = cap


class BudgetExhaustedError(HeffterError):
    def __init__(self, nodes: int):
        super().__init__(f"Search budget exhausted after {nodes} nodes")
        self.nodes = nodes
