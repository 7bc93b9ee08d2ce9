# src/models/__init__.py
# Domain types plus the ORM models; importing this registers the tables with Base.
from .base import Base
from .graph import Edge, Graph, GnpSpec, sample_gnp
from .pattern import Pattern, lambda_
from .experiment_run import ExperimentRun, ProbeRecord

__all__ = [
    'Base',
    'Edge',
    'Graph',
    'GnpSpec',
    'sample_gnp',
    'Pattern',
    'lambda_',
    'ExperimentRun',
    'ProbeRecord',
]
