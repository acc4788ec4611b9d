# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0
