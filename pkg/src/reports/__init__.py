"""
Report generation for text, JSON and CSV output.
"""

from src.reports.report_generator import (
    BranchRecord,
    ReportGenerator,
    ResultDocument,
    ZeroRecord,
    decomposition_document,
    zeros_document,
)

__all__ = [
    'BranchRecord',
    'ReportGenerator',
    'ResultDocument',
    'ZeroRecord',
    'decomposition_document',
    'zeros_document',
]
