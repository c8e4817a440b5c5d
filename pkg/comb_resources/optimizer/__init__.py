import logging
logging.basicConfig()
logger = logging.getLogger(__package__)
logger.setLevel(level=logging.INFO)
