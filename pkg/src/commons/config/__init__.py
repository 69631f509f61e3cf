from .loader import load_key_values

__all__ = ["load_key_values"]
