"""
splv - 演化软件产品线的变异性一致性验证工具
"""

__version__ = '0.1.0'
