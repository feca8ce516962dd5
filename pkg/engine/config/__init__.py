from config.settings import SETTINGS, TOOL_VERSION, Settings

__all__ = ["SETTINGS", "TOOL_VERSION", "Settings"]
