from .announce import AnnouncementEntry, AnnouncementLog, AnnouncementSink
from .app import create_app
from .pipeline import CommitmentPipeline, CommitmentResult, StatusView, TickSummary

__all__ = [
    "AnnouncementEntry",
    "AnnouncementLog",
    "AnnouncementSink",
    "CommitmentPipeline",
    "CommitmentResult",
    "StatusView",
    "TickSummary",
    "create_app",
]
