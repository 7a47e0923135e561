"""Repository question-answering bot over mined Git and issue-tracker data."""

__version__ = "0.1.0"
