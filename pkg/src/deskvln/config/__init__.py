from deskvln.config.validate import ENV_VAR_SPECS, validate_all, validate_env_var
