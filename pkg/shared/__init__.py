"""Shared models, certified reals and settings for brs-certify."""
