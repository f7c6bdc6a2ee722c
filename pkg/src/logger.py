#!/usr/bin/env python3
"""
Logging configuration for fincat-herm
"""

import logging
import os
from logging.handlers import RotatingFileHandler


def _resolve_log_dir():
    """Pick the log directory: explicit override, then data/logs, then logs."""
    override = os.getenv('FINCAT_LOG_DIR')
    if override:
        return override
    if os.path.exists('data'):
        return 'data/logs'
    return 'logs'


def _resolve_level(default):
    name = os.getenv('FINCAT_LOG_LEVEL')
    if not name:
        return default
    level = logging.getLevelName(name.strip().upper())
    return level if isinstance(level, int) else default


def setup_logger(name='fincat', log_level=logging.WARNING):
    """Setup logger with file and console handlers."""
    log_level = _resolve_level(log_level)

    log_dir = _resolve_log_dir()
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, f'{name}.log')

    logger = logging.getLogger(name)
    logger.setLevel(log_level)

    # Remove existing handlers
    logger.handlers = []

    # File handler with rotation
    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=10*1024*1024,  # 10MB
        backupCount=5
    )
    file_handler.setLevel(log_level)
    file_format = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    file_handler.setFormatter(file_format)

    # Console handler goes to stderr so reports on stdout stay clean
    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    return logger


# Create default logger
logger = setup_logger()
