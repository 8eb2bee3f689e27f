from .file_result_repository import FileResultRepository

__all__ = ["FileResultRepository"]
