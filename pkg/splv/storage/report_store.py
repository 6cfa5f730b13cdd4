"""
报告存储 - 按扩展名选择 kv 或 JSON，支持在数据目录中归档历次运行
"""
import os
from typing import List, Optional

from splv.storage.file_storage import FileStorage
from splv.utils.helpers import format_timestamp, get_current_timestamp
from splv.utils.logger import get_logger
from splv.workbench.report import Report, parse_report, render_json, render_kv

logger = get_logger("report_store")


def _render_for(path: str, report: Report) -> str:
    return render_json(report) if path.endswith(".json") else render_kv(report)


class ReportStore:
    """
    报告读写与归档

    归档文件位于 <data_dir>/reports/<名称>.kv，同名报告覆盖旧的归档。
    """

    def __init__(self, data_dir: str = "./data"):
        self.data_dir = data_dir
        self.archive = FileStorage(os.path.join(data_dir, "reports"))
        self.files = FileStorage()

    def save(self, path: str, report: Report) -> str:
        """
        把报告写到指定路径(.json 为 JSON，其余为 kv)

        Returns:
            写入的路径
        """
        written = self.files.write_text_sync(path, _render_for(path, report))
        logger.info(f"报告已写入: {written}")
        return written

    async def save_async(self, path: str, report: Report) -> str:
        written = await self.files.write_text(path, _render_for(path, report))
        logger.info(f"报告已写入: {written}")
        return written

    def archive_report(self, report: Report) -> str:
        """把报告归档到数据目录"""
        filename = f"{report.name}.kv"
        written = self.archive.write_text_sync(filename, render_kv(report))
        logger.info(f"报告已归档: {written} ({format_timestamp(get_current_timestamp())})")
        return written

    def list_archived(self) -> List[str]:
        return [f[:-len(".kv")] for f in self.archive.list_files("*.kv")]

    def resolve(self, name_or_path: str) -> Optional[str]:
        """已存在的路径原样返回，否则按归档名查找"""
        if os.path.exists(name_or_path):
            return name_or_path
        archived = self.archive.get_file_path(f"{name_or_path}.kv")
        return archived if os.path.exists(archived) else None

    def load(self, name_or_path: str) -> Report:
        """
        加载报告

        Args:
            name_or_path: 报告路径或归档名

        Returns:
            报告
        """
        path = self.resolve(name_or_path)
        if path is None:
            raise FileNotFoundError(f"报告不存在: {name_or_path}")
        report = parse_report(self.files.read_text_sync(path), source=path)
        logger.debug(f"加载报告 {report.name}: {len(report.features)} 个特性")
        return report
