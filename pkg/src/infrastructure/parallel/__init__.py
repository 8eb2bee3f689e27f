from .block_executors import ProcessPoolBlockExecutor, SerialBlockExecutor, create_block_executor

__all__ = ["ProcessPoolBlockExecutor", "SerialBlockExecutor", "create_block_executor"]
