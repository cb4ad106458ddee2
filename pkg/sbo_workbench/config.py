"""Environment configuration.

Only the report directory can be overridden from the environment
(``SBO_OUTPUT_DIR``); a ``.env`` file in the working directory is honoured.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, field_validator

from .constants import REPORT_DEFAULTS

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "SBO_OUTPUT_DIR"


class WorkbenchSettings(BaseModel):
    output_dir: Path = Path(REPORT_DEFAULTS["output_dir"])

    model_config = ConfigDict(frozen=True)

    @field_validator("output_dir")
    @classmethod
    def validate_output_dir(cls, v):
        if not str(v).strip():
            raise ValueError("output directory must not be empty")
        return v

    def report_path(self, suite: str, extension: str = "json") -> Path:
        """Where the report of one suite is written."""
        return self.output_dir / f"{suite}.{extension}"


def load_settings(env_file: Optional[str] = None) -> WorkbenchSettings:
    """Settings from the environment, after loading ``env_file`` (or ./.env) if present."""
    load_dotenv(env_file)
    output_dir = os.getenv(OUTPUT_DIR_ENV)
    if output_dir:
        logger.debug(f"Report directory overridden by {OUTPUT_DIR_ENV}: {output_dir}")
        return WorkbenchSettings(output_dir=Path(output_dir))
    return WorkbenchSettings()
