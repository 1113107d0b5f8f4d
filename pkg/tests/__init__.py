"""
Test suite - pytest + hypothesis.
"""
