import logging

# Silence pypegasus completely
logging.getLogger("pypegasus").setLevel(logging.CRITICAL)
