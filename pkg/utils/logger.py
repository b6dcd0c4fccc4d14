import logging
import os
from datetime import date
from logging.handlers import RotatingFileHandler

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
CONSOLE_FORMAT = '%(name)s - %(levelname)s - %(message)s'
MAX_LOG_BYTES = 10 * 1024 * 1024


def log_path() -> str:
    """Daily log file under QIOPE_LOG_DIR (default ./logs)"""
    log_dir = os.environ.get('QIOPE_LOG_DIR', 'logs')
    os.makedirs(log_dir, exist_ok=True)
    return os.path.join(log_dir, f'qiope_{date.today():%Y%m%d}.log')


def console_level() -> int:
    """QIOPE_LOG_LEVEL for stderr output; warnings and above by default"""
    name = os.environ.get('QIOPE_LOG_LEVEL', 'WARNING').upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def setup_logger(name: str, level=logging.INFO) -> logging.Logger:
    """Setup a qiope.<name> logger writing to the rotating log file and stderr"""
    logger = logging.getLogger(f'qiope.{name}')
    logger.setLevel(level)
    if logger.handlers:
        return logger

    file_handler = RotatingFileHandler(log_path(), maxBytes=MAX_LOG_BYTES, backupCount=5)
    file_handler.setLevel(level)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    # stdout is reserved for command results
    console_handler = logging.StreamHandler()
    console_handler.setLevel(console_level())
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))

    for handler in (file_handler, console_handler):
        logger.addHandler(handler)
    logger.propagate = False
    return logger
