"""
工作台 - 模型文件格式、产品线清单、报告、随机生成器与命令行
"""
