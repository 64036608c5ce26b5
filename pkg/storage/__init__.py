# Storage Package
from storage.kl_storage import KLStorage

__all__ = ["KLStorage"]
