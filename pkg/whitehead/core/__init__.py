"""
Core package.
Settings, errors and logging shared by every layer.
"""
