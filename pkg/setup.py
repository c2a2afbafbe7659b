import re

from setuptools import setup, find_packages


def find_version():
    version_file = "crystalwalk/__version__.py"
    version_line = open(version_file, "rt").read()
    match_object = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", version_line, re.M)

    if not match_object:
        raise RuntimeError("Unable to find version string in %s" % version_file)

    return match_object.group(1)


with open("README.rst") as readme_file:
    readme = readme_file.read()


setup(
    name="crystalwalk",
    version=find_version(),
    description="Exact and Monte Carlo diffusivity of periodic crystal-surface height walks",
    long_description=readme,
    license="MIT",
    packages=find_packages(exclude=["test", "test.*"]),
    python_requires=">=3.8",
    install_requires=[
        "marshmallow>=3,<4",
        "numpy>=1.22",
        "python-box",
        "scipy>=1.12",
        "simplejson<4",
        "svgwrite<2",
        "sympy>=1.13",
        "yapconf>=0.3.7",
    ],
    entry_points={"console_scripts": ["crystalwalk = crystalwalk.cli:main"]},
    classifiers=[
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
