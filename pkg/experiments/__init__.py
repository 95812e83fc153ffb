"""
Experiment runners, configuration and report writers for Laurent Lab.
"""
