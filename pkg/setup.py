"""
Graph Denoise Core Setup Configuration
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README file
readme_path = Path(__file__).parent / "docs" / "README.md"
long_description = readme_path.read_text(encoding="utf-8") if readme_path.exists() else ""

# Read requirements
requirements = [
    "numpy>=1.26",
    "scipy>=1.11",  # sparse operators, dense solves, spearmanr
    "loguru>=0.7.0",
    "tenacity>=8.2.0",  # SBM resampling until connected
    "jsonschema>=4.0.0",
    "PyYAML>=6.0",
    "python-dotenv>=1.0.0",  # For environment configuration
]

dev_requirements = [
    "pytest>=7.4.0",
    "pytest-asyncio>=0.21.0",
    "hypothesis>=6.100.0",
]

setup(
    name="graph-denoise",
    version="0.1.0",
    author="Graph Denoise Team",
    description="图信号去噪卷积核、谱方法对照与节点分类实验工具",
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_dir={"": "src"},
    packages=find_packages(where="src", include=["graph_denoise_core", "graph_denoise_core.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={
        "dev": dev_requirements,
        "all": requirements + dev_requirements,
    },
    include_package_data=True,
    package_data={
        "graph_denoise_core": ["config/default.yaml"],
    },
    entry_points={
        "console_scripts": [
            "graph-denoise=graph_denoise_core.cli:main",
        ],
    },
    keywords="graph signal processing, denoising, graph convolution, node classification",
)
