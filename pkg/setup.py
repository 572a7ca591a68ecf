"""
setup.py for twomode


"""

import os

from setuptools import find_packages, setup

THIS_DIR = os.path.abspath(os.path.dirname(__file__))


def get_requirements(req_file):
    requirements = []

    for r in open(os.path.join(THIS_DIR, "requirements", req_file)).read().splitlines():
        if r.strip() and not r.startswith(("#", "-r")):
            requirements.append(r.strip())

    return requirements


def get_version():
    scope = {}
    exec(open(os.path.join(THIS_DIR, "twomode", "_version.py")).read(), scope)

    return scope["__version__"]


setup(
    name="twomode",
    license="MIT",
    zip_safe=False,
    version=get_version(),
    install_requires=get_requirements("main.txt"),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    description="Entangled number states of two bosonic modes",
    long_description=open("README.rst").read(),
    packages=find_packages(exclude=["tests*"]),
    python_requires=">=3.9",
    include_package_data=True,
    package_data={
        "twomode": ["py.typed"],
    },
    entry_points={
        "console_scripts": ["twomode=twomode.cli:main"],
    },
)
