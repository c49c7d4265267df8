# -*- coding: utf-8 -*-
"""python -m vesselpy"""

import sys

from vesselpy.cli import main

sys.exit(main())
