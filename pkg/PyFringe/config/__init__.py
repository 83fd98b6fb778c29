from PyFringe.config.config_run import *
