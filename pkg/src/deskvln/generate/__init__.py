from deskvln.generate.generate import EPISODES_FILE, MANIFEST_FILE, cmd_generate, config_hash
