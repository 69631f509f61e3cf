from .logger import logger, set_level, SERVICE_NAME

__all__ = ["logger", "set_level", "SERVICE_NAME"]
