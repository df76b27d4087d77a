"""Version information for einsel."""

__version__ = "0.1.0"
__author__ = "Einsel Developers"
__email__ = "dev@example.com"
__license__ = "MIT"
