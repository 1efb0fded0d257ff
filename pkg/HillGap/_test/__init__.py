"""
:Date: 22.02.2026

..	versionadded:: v0.1.0
"""
