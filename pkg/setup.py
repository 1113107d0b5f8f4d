"""
Dynamic setup.py - 自动检测目录名作为包名

安装:
    cd <your_project_directory>
    python3 -m venv venv
    source venv/bin/activate
    pip install -e ".[dev]"

目录名即包名，可随意命名。
"""

import os
from setuptools import setup

# 动态获取当前目录名作为包名
PACKAGE_DIR = os.path.dirname(os.path.abspath(__file__))
PACKAGE_NAME = os.path.basename(PACKAGE_DIR)

# 子包列表
SUBPACKAGES = [
    "cli", "config", "core", "domains", "prox",
    "schemas", "solver", "verify", "weights", "tests"
]

# 构建 packages 和 package_dir
packages = [PACKAGE_NAME] + [f"{PACKAGE_NAME}.{sub}" for sub in SUBPACKAGES]
package_dir = {PACKAGE_NAME: "."}
package_dir.update({f"{PACKAGE_NAME}.{sub}": sub for sub in SUBPACKAGES})

setup(
    name=PACKAGE_NAME,
    version="1.0.0",
    description="Elliptic problems on weighted Gaussian spaces: Galerkin solver and verification suites",
    packages=packages,
    package_dir=package_dir,
    package_data={f"{PACKAGE_NAME}.config": ["*.yaml"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.12",
        "pyyaml>=6.0",
    ],
    extras_require={"dev": ["pytest>=7.0.0", "hypothesis>=6.0"]},
    entry_points={
        "console_scripts": [
            f"gauss-lab={PACKAGE_NAME}.__main__:main",
        ],
    },
    include_package_data=True,
)
