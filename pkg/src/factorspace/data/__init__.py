"""Bundled toy corpus and pipeline configuration."""

from importlib import resources


def path(name: str):
    return resources.files(__name__).joinpath(name)


def toy_corpus():
    return path("toy_recipes.mmf")


def toy_config():
    return path("toy_config.json")
