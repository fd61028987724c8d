import os
from ticktock import create_app

# Determine the configuration environment
config_name = os.environ.get('TICKTOCK_ENV', 'default')

# Create the command-line application
cli = create_app(config_name)

if __name__ == '__main__':
    cli(prog_name='ticktock')
