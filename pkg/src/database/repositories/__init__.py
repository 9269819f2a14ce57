from .class_set_repo import ClassSetRepository

__all__ = ['ClassSetRepository']
