"""
文件存储与报告存储测试
"""
import asyncio
import os

import pytest

from splv.storage.file_storage import FileStorage
from splv.storage.report_store import ReportStore
from splv.workbench.report import FeatureResult, Report, SplResult


def small_report(name="Demo"):
    return Report(name, "spl", [FeatureResult("A", 2, 2, 3, True, (), 0.5)], SplResult("qbf", True))


def test_sync_write_creates_directories(tmp_path):
    storage = FileStorage(str(tmp_path))
    path = storage.write_text_sync("nested/dir/a.txt", "hello")
    assert path == os.path.join(str(tmp_path), "nested/dir/a.txt")
    assert storage.read_text_sync("nested/dir/a.txt") == "hello"
    assert storage.file_exists("nested/dir/a.txt")
    assert not os.path.exists(path + ".tmp")


def test_async_write_and_read(tmp_path):
    storage = FileStorage(str(tmp_path))

    async def go():
        await asyncio.gather(*(storage.write_text("same.txt", f"v{i}") for i in range(5)))
        return await storage.read_text("same.txt")

    assert asyncio.run(go()) in {f"v{i}" for i in range(5)}
    assert storage.list_files() == ["same.txt"]


def test_list_files_filters_and_tolerates_missing_directory(tmp_path):
    storage = FileStorage(str(tmp_path))
    for name in ("b.kv", "a.kv", "c.json"):
        storage.write_text_sync(name, "")
    assert storage.list_files("*.kv") == ["a.kv", "b.kv"]
    assert FileStorage(str(tmp_path / "absent")).list_files() == []


def test_absolute_paths_bypass_the_data_dir(tmp_path):
    target = str(tmp_path / "elsewhere.txt")
    assert FileStorage("ignored").write_text_sync(target, "x") == target


def test_report_store_save_by_extension(tmp_path):
    store = ReportStore(str(tmp_path / "data"))
    report = small_report()
    json_path = store.save(str(tmp_path / "r.json"), report)
    kv_path = asyncio.run(store.save_async(str(tmp_path / "r.kv"), report))
    assert open(json_path, encoding="utf-8").read().lstrip().startswith("{")
    assert open(kv_path, encoding="utf-8").read().startswith("report.name=Demo")
    assert store.load(json_path) == report
    assert store.load(kv_path) == report


def test_archive_list_and_resolve(tmp_path):
    store = ReportStore(str(tmp_path / "data"))
    assert store.list_archived() == []
    store.archive_report(small_report("Beta"))
    store.archive_report(small_report("Alpha"))
    store.archive_report(small_report("Alpha"))
    assert store.list_archived() == ["Alpha", "Beta"]
    assert store.resolve("Alpha") == os.path.join(str(tmp_path / "data"), "reports", "Alpha.kv")
    assert store.load("Beta").name == "Beta"
    assert store.resolve("Gamma") is None
    with pytest.raises(FileNotFoundError):
        store.load("Gamma")
