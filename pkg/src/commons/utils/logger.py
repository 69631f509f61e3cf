import logging
import os
import sys

from aws_lambda_powertools import Logger

SERVICE_NAME = "meanspec"
DEFAULT_LEVEL = "INFO"

# stdout carries command output, so records go to stderr
logger = Logger(
    service=SERVICE_NAME,
    level=os.environ.get("MEANSPEC_LOG_LEVEL", DEFAULT_LEVEL),
    logger_handler=logging.StreamHandler(sys.stderr),
)


def set_level(level: str) -> None:
    """Change the level of the shared logger"""
    logger.setLevel(level.upper())
