import logging
import sys
from typing import Optional
from fredholm.core.config import get_settings

def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """Configure logging for the command line tool"""
    settings = get_settings()
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL
    log_level = getattr(logging, str(level).upper(), logging.INFO)

    # Configure root logger
    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout)
        ],
        force=True
    )

    # Create logger for this application
    logger = logging.getLogger("fredholm")
    logger.setLevel(log_level)

    return logger
