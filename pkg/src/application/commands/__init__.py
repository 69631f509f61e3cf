from .run_config import RunConfig, DomainDescriptor, parse_descriptor

__all__ = ["RunConfig", "DomainDescriptor", "parse_descriptor"]
