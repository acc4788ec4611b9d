# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

from listhyp.tools.cli import app

if __name__ == "__main__":
    app(prog_name="listhyp")
