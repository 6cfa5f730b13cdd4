"""
核心模块 - 带变体的有限状态机、符合性检查、组合与验证引擎
"""
