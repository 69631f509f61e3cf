from .timed import timed

__all__ = ["timed"]
