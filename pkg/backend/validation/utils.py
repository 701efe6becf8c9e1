"""
Validation utilities and custom exceptions.
"""
import logging
from typing import Any, Dict, Optional

from marshmallow import ValidationError as MarshmallowValidationError

from errors import HelixError

logger = logging.getLogger(__name__)


class ValidationError(HelixError):
    """Input rejected by a schema in strict mode."""

    def __init__(self, message: str, errors: Dict[str, Any] = None):
        self.errors = errors or {}
        super().__init__(message, self.errors)


def log_validation_error(source: str, data: Any, errors: Dict[str, Any],
                         strict_mode: bool = False) -> None:
    """Log validation errors with appropriate level."""
    if strict_mode:
        logger.error(f"Validation error in {source}: {errors}")
    else:
        logger.warning(f"Validation warning in {source}: {errors}")
    logger.debug(f"Input data: {data}")


def format_validation_errors(errors: Any) -> str:
    """Format marshmallow validation errors into a readable string."""
    formatted_errors = []

    def flatten_errors(error_dict, prefix: str = "") -> None:
        for key, value in error_dict.items():
            current_key = f"{prefix}.{key}" if prefix else str(key)

            if isinstance(value, dict):
                flatten_errors(value, current_key)
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, str):
                        formatted_errors.append(f"{current_key}: {item}")
                    elif isinstance(item, dict):
                        flatten_errors(item, current_key)
            else:
                formatted_errors.append(f"{current_key}: {value}")

    if isinstance(errors, dict):
        flatten_errors(errors)
    elif isinstance(errors, list):
        formatted_errors.extend(str(e) for e in errors)
    else:
        formatted_errors.append(str(errors))
    return "; ".join(formatted_errors)


def validate_data(schema, data: Any, strict_mode: bool = False,
                  source: str = "unknown") -> tuple[Any, Optional[Dict[str, Any]]]:
    """
    Validate data against a schema.

    Args:
        schema: Marshmallow schema instance
        data: Data to validate
        strict_mode: Whether to raise on validation errors
        source: Command or endpoint name for logging

    Returns:
        Tuple of (validated_data, errors)

    Raises:
        ValidationError: If strict_mode is True and validation fails
    """
    try:
        return schema.load(data), None
    except MarshmallowValidationError as e:
        errors = e.messages
        log_validation_error(source, data, errors, strict_mode)

        if strict_mode:
            raise ValidationError(
                f"Validation failed for {source}: {format_validation_errors(errors)}",
                errors if isinstance(errors, dict) else {'_schema': errors}
            )

        # Warn-only mode hands back the raw input
        return data, errors
