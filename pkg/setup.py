from setuptools import setup, find_packages  # Always prefer setuptools over distutils
from codecs import open  # To use a consistent encoding
from os import path
import re

here = path.abspath(path.dirname(__file__))

# Get the long description from the relevant file
with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

# read the version without importing the package and its dependencies
with open(path.join(here, 'vesselpy', '__init__.py'), encoding='utf-8') as f:
    version = re.search(r'__version__ = "([^"]+)"', f.read()).group(1)

setup(
    name='vesselpy',

    # Versions should comply with PEP440.
    version=version,

    description='Multi-task retinal vessel segmentation and artery/vein classification',
    long_description=long_description,

    license='MIT',

    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        'Development Status :: 3 - Alpha',

        'Intended Audience :: Developers',
        'Intended Audience :: Education',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Image Recognition',
        'Topic :: Scientific/Engineering :: Medical Science Apps.',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',

        'Operating System :: Microsoft :: Windows',
        'Operating System :: POSIX',
        'Operating System :: Unix',
        'Operating System :: MacOS'
    ],

    keywords='retina fundus vessel segmentation artery vein classification '
             'convolutional network gabor',

    packages=find_packages(exclude=['contrib', 'docs', 'examples']),

    python_requires='>=3.8',

    # List run-time dependencies here.
    install_requires=['numpy', 'scipy', 'matplotlib', 'Pillow', 'scikit-image'],

    extras_require={
        'test': ['pytest'],
    },

    entry_points={
        'console_scripts': [
            'vesselpy=vesselpy.cli:main',
        ],
    },
)
