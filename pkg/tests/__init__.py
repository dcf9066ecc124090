"""__init__"""
