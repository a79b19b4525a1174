import structlog
from pypegasus import set_logger

# Any logger with debug/info/warning/error methods works
set_logger(structlog.get_logger())
