from .i_block_executor import IBlockExecutor, Block
from .i_result_repository import IResultRepository, SeriesRow

__all__ = [
    "IBlockExecutor",
    "Block",
    "IResultRepository",
    "SeriesRow",
]
