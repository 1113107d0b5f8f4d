"""
Command dispatch shared by __main__ and the tests.
"""

import logging
from typing import Any, Dict, Optional, Sequence, Tuple, Type

from ..core.constants import Command
from ..core.errors import ConfigValidationError
from .base import EXIT_INPUT_ERROR, CommandHandler, load_config
from .boundary import IbpCheckHandler, NeumannCheckHandler
from .checks import ProjectCheckHandler, ProxCheckHandler
from .identities import IdentitiesHandler
from .solve import SolveHandler
from .sweep import PenalizeSweepHandler

logger = logging.getLogger(__name__)

HANDLERS: Dict[Command, Type[CommandHandler]] = {
    Command.SOLVE: SolveHandler,
    Command.PENALIZE_SWEEP: PenalizeSweepHandler,
    Command.PROX_CHECK: ProxCheckHandler,
    Command.PROJECT_CHECK: ProjectCheckHandler,
    Command.NEUMANN_CHECK: NeumannCheckHandler,
    Command.IBP_CHECK: IbpCheckHandler,
    Command.IDENTITIES: IdentitiesHandler,
}


def run(
    command,
    config_path: Optional[str] = None,
    overrides: Sequence[str] = (),
    out_dir: Optional[str] = None,
    threads: Optional[int] = None,
) -> Tuple[CommandHandler, Dict[str, Any]]:
    """
    Load the configuration and execute one command.

    Returns the handler (for format_output) and its result dictionary; the result
    carries `exit_code`.
    """
    handler_cls = HANDLERS[Command(command)]
    try:
        config = load_config(config_path, overrides)
    except ConfigValidationError as e:
        logger.error("invalid configuration: %s", e)
        handler = handler_cls(out_dir=out_dir, threads=threads)
        return handler, {"success": False, "error": str(e), "errors": e.errors, "exit_code": EXIT_INPUT_ERROR}
    handler = handler_cls(config, out_dir, threads)
    return handler, handler.execute()
