class WalkerError(Exception):
    """Base class for every error raised by walkpart."""


class GeometryError(WalkerError):
    pass


class ConstructionError(WalkerError):
    pass


class TraceError(WalkerError):
    pass


class GraphError(WalkerError):
    pass


class PartitionError(WalkerError):
    pass


class AddressError(PartitionError):
    pass


class CapacityError(WalkerError):
    pass


class StoreError(WalkerError):
    pass


class StoreFormatError(StoreError):
    """Malformed store log or manifest; ``offset`` is the byte where parsing stopped."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset
