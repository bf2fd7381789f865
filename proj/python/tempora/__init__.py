# Copyright 2026 The Tempora Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the tempora C++ library."""

from tempora._core import *  # noqa: F401,F403
from tempora._core import Error, TaskKind, RewardMode, parse_output, serialize_output

__version__ = "0.1.0"


def parse_ag(text, lenient=False):
    return parse_output(TaskKind.AG, text, lenient)


def parse_sed(text, lenient=False):
    return parse_output(TaskKind.SED, text, lenient)


def parse_dac(text, lenient=False):
    return parse_output(TaskKind.DAC, text, lenient)
