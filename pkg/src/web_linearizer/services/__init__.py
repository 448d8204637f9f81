"""Service layer for the web linearizer.

This module keeps the CLI apart from the pipeline, with one shared
obstruction tower per process.
"""

from .linearization_service import LinearizationService
from .service_factory import ServiceFactory

__all__ = ['LinearizationService', 'ServiceFactory']
