"""
QBF 模块 - 布尔电路、SAT 求解、∀∃ 公式的构造、求解与导出
"""
