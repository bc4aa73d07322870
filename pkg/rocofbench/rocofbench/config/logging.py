import sys

from loguru import logger

from rocofbench.config.settings import settings


def configure_logging(
        level: str | None = None,
        serialize: bool | None = None
) -> None:
    """
    Replace loguru's default sink with a stderr sink.

    Parameters
    ----------
    level : str | None
        Minimum level. Defaults to settings.LOG_LEVEL.
    serialize : bool | None
        Emit JSON records. Defaults to settings.LOG_SERIALIZE.
    """
    logger.remove()
    logger.add(
        sys.stderr,
        level=level or settings.LOG_LEVEL,
        serialize=settings.LOG_SERIALIZE if serialize is None else serialize,
    )
    logger.debug(f"Logging configured at level {level or settings.LOG_LEVEL}")
