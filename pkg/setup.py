#!/usr/bin/env python3
"""
🎯 GEOCENTER - SETUP & INSTALLATION
Geodesic centers of polygonal domains with holes, with a JSON/SVG command line.
"""

import os
import sys
from setuptools import setup, find_packages

# Ensure Python 3.8+
if sys.version_info < (3, 8):
    sys.exit("Python 3.8 or higher is required for geocenter")


def read_readme():
    readme_path = os.path.join(os.path.dirname(__file__), 'README.md')
    if os.path.exists(readme_path):
        with open(readme_path, 'r', encoding='utf-8') as f:
            return f.read()
    return "geocenter - geodesic centers of polygonal domains with holes"


def read_requirements():
    req_path = os.path.join(os.path.dirname(__file__), 'requirements.txt')
    requirements = []
    if os.path.exists(req_path):
        with open(req_path, 'r') as f:
            for line in f:
                line = line.strip()
                if line and not line.startswith('#'):
                    requirements.append(line)
    return requirements


extra_requirements = {
    'dev': [
        'pytest>=7.0.0',
        'hypothesis>=6.0.0',
        'pytest-cov>=4.0.0',
        'black>=22.0.0',
        'flake8>=5.0.0',
        'mypy>=0.991',
    ]
}

setup(
    name="geocenter",
    version="0.1.0",
    description="Geodesic centers of polygonal domains with holes",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["geocenter*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
        "Environment :: Console",
    ],
    python_requires=">=3.8",
    install_requires=read_requirements() or [
        "numpy>=1.21.0",
        "scipy>=1.9.0",
        "networkx>=2.8",
        "shapely>=2.0.0",
        "pyyaml>=6.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require=extra_requirements,
    entry_points={
        "console_scripts": [
            "geocenter=geocenter.cli:main",
        ]
    },
    package_data={
        "": ["*.yaml"],
    },
    data_files=[("", ["geocenter_config.yaml"])],
    include_package_data=True,
    zip_safe=False,
    keywords=["geodesic center", "polygonal domain", "shortest path", "computational geometry"],
    platforms=["any"],
    license="MIT",
)
