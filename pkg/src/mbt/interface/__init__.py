from .tablefile import load_table, save_table

__all__ = ["load_table", "save_table"]
