import os

from setuptools import find_packages, setup

with open('README_pypi.md', 'r', encoding='utf8') as f:
    long_description = f.read()

# get requirements
with open('requirements.txt') as f:
    requirements = f.read().splitlines()

setup(
    name='PyFringe',
    use_scm_version={'write_to': os.path.join('PyFringe', '_version.py')},

    description='PyFringe: A software package to steer double-slit interference fringes with two trainable qubit sources',
    long_description=long_description,
    long_description_content_type='text/markdown',

    license='GPL-3.0',
    keywords=['science', 'optics', 'diffraction', 'interference', 'qubits', 'optimization'],
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Operating System :: OS Independent',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
    ],

    python_requires='>=3.9',
    install_requires=requirements,

    packages=find_packages(),
    include_package_data=True,
    zip_safe=False,
    entry_points={
        'console_scripts': [
            'pyfringe = PyFringe.pyfringe_cli:main'
        ]
    },
)
