"""
文件存储实现 - 验证产物(报告、导出文件)的原子写入与读取
"""
import asyncio
import fnmatch
import os
import shutil
from typing import Dict, List, Optional

import aiofiles

from splv.utils.logger import get_logger

logger = get_logger("file_storage")


class FileStorage:
    """文本产物存储，所有写入先落到临时文件再原子替换"""

    def __init__(self, data_dir: str = "."):
        """
        初始化文件存储

        Args:
            data_dir: 相对文件名的根目录
        """
        self.data_dir = data_dir
        # 同一文件的并发写入串行化
        self._file_locks: Dict[str, asyncio.Lock] = {}

    def get_file_path(self, filename: str) -> str:
        """相对文件名按 data_dir 解析，绝对路径原样返回"""
        return os.path.join(self.data_dir, filename)

    def _prepare(self, file_path: str) -> str:
        parent = os.path.dirname(file_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return f"{file_path}.tmp"

    @staticmethod
    def _discard(temp_file: str) -> None:
        if os.path.exists(temp_file):
            try:
                os.unlink(temp_file)
            except OSError:
                pass

    def write_text_sync(self, filename: str, content: str) -> str:
        """
        同步写入文本文件

        Args:
            filename: 文件名或路径
            content: 文本内容

        Returns:
            写入的完整路径
        """
        file_path = self.get_file_path(filename)
        temp_file = self._prepare(file_path)
        try:
            with open(temp_file, "w", encoding="utf-8") as f:
                f.write(content)
            shutil.move(temp_file, file_path)
        except OSError as e:
            logger.error(f"写入文件 {file_path} 失败: {e}")
            self._discard(temp_file)
            raise
        logger.debug(f"写入 {file_path} ({len(content)} 字节)")
        return file_path

    async def write_text(self, filename: str, content: str) -> str:
        """
        异步写入文本文件，同一路径的写入按锁串行

        Args:
            filename: 文件名或路径
            content: 文本内容

        Returns:
            写入的完整路径
        """
        file_path = self.get_file_path(filename)
        lock = self._file_locks.setdefault(file_path, asyncio.Lock())
        async with lock:
            temp_file = self._prepare(file_path)
            try:
                async with aiofiles.open(temp_file, "w", encoding="utf-8") as f:
                    await f.write(content)
                shutil.move(temp_file, file_path)
            except OSError as e:
                logger.error(f"写入文件 {file_path} 失败: {e}")
                self._discard(temp_file)
                raise
        logger.debug(f"写入 {file_path} ({len(content)} 字节)")
        return file_path

    def read_text_sync(self, filename: str) -> str:
        """读取文本文件，文件不存在时抛出 FileNotFoundError"""
        with open(self.get_file_path(filename), "r", encoding="utf-8") as f:
            return f.read()

    async def read_text(self, filename: str) -> str:
        async with aiofiles.open(self.get_file_path(filename), "r", encoding="utf-8") as f:
            return await f.read()

    def list_files(self, pattern: Optional[str] = None) -> List[str]:
        """
        列出目录中的文件

        Args:
            pattern: 文件名模式(可选)

        Returns:
            排序后的文件名列表，目录不存在时为空
        """
        try:
            files = sorted(os.listdir(self.data_dir))
        except FileNotFoundError:
            return []
        if pattern:
            files = [f for f in files if fnmatch.fnmatch(f, pattern)]
        return files

    def file_exists(self, filename: str) -> bool:
        return os.path.exists(self.get_file_path(filename))
