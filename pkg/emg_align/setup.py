# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause


import os
from glob import glob
from setuptools import setup
from setuptools import find_packages

package_name = 'emg_align'

setup(
    name=package_name,
    version='0.1.0',
    packages=find_packages(exclude=['test']),
    data_files=[
        (os.path.join('share', package_name, 'config'), glob(os.path.join('config', '*.yaml'))),
    ],
    install_requires=[
        'setuptools',
        'numpy>=1.26,<2',
        'scipy>=1.11,<2',
        'pandas>=2.1,<3',
        'pydantic>=2.12,<3',
        'PyYAML>=6.0,<7',
    ],
    extras_require={
        'test': ['pytest>=7', 'pytest-cov>=4'],
    },
    zip_safe=True,
    maintainer='brimo',
    maintainer_email='abizov94@gmail.com',
    description='Multi-day sEMG gesture classification stabilized by CCA alignment',
    license='BSD-3-Clause',
    entry_points={
        'console_scripts': [
            'emg_align = emg_align.main:main',
        ],
    },
)
