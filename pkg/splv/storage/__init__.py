"""
存储模块 - 验证产物与报告的文件读写
"""
