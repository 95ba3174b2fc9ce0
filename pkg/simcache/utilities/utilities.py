"""
General configuration, environment and logging functions.

:Organization: simcache developers

"""
# External modules
import logging
import os
import sys
import yaml

from .. import __version__ as __simcache__version__

LOGGER_NAME = '__simcache__'
LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s'


class classproperty(object):
    def __init__(self, f):
        self.f = classmethod(f)

    def __get__(self, *a):
        return self.f.__get__(*a)()


class SimcacheEnvironment(object):
    @classproperty
    def __simcache__version__(self):
        return __simcache__version__

    @classproperty
    def __simcache__config__location__(self):
        if 'simcache_config' in os.environ:
            return os.environ['simcache_config']
        return 'UNSET'

    @classproperty
    def __simcache__environment__dict__(self):
        env = SimcacheEnvironment
        import astropy
        import numpy
        import scipy
        env_dict = {
                    'simcache_version': env.__simcache__version__,
                    'simcache_config_location': env.__simcache__config__location__,
                    'numpy_version': numpy.__version__,
                    'scipy_version': scipy.__version__,
                    'astropy_version': astropy.__version__
                   }
        return env_dict

    @classproperty
    def __simcache__environment__report__(self):
        env = SimcacheEnvironment.__simcache__environment__report__pretty__
        return env.replace("\n", " ").replace("\t", " ")

    @classproperty
    def __simcache__environment__report__pretty__(self):
        env = SimcacheEnvironment.__simcache__environment__dict__
        report = ""
        report += "simcache Version {} with configuration {}.\n".format(env['simcache_version'],
                                                                      env['simcache_config_location'])
        report += "\tnumpy {}, scipy {}, astropy {}\n".format(env['numpy_version'],
                                                             env['scipy_version'],
                                                             env['astropy_version'])
        return report


def InitLogger(kwargs=None):
    """
    Return the logger passed as ``kwargs['logger']``, or the shared simcache
    logger with its level taken from the ``log_level`` parameter and a stderr
    handler attached if it has none.
    """
    kwargs = kwargs if kwargs is not None else {}
    if kwargs.get('logger', None) is not None:
        return kwargs['logger']
    logger = logging.getLogger(LOGGER_NAME)
    log_level = SelectParameter('log_level', kwargs)
    logger.setLevel(getattr(logging, str(log_level).upper()))
    if not len(logger.handlers):
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(stream_handler)
    return logger


def SelectParameter(name, override_dict=None, config_file=None):
    """
    If override_dict contains the key name, return override_dict[name].
    Otherwise, if the parameter name is present in the configuration file,
    return the value found in the configuration file. Otherwise, if an alternate
    name (as defined in a local dictionary) is found in the configuration file,
    return the value for that name. Otherwise, return None.

    Parameters
    ----------
    name : str
        Name of parameter

    override_dict : dict, default None
        Dictionary that may override a configuration value

    config_file : str, default None
        Supplied configuration file

    Returns
    -------
    value : obj
        The value found (None if no value is found)
    """
    name_mappings = {
                        'alpha': 'grid_alpha',
                        'capacities': 'sweep_capacities',
                        'cores': 'parallel_ncores',
                        'd': 'similarity_threshold',
                        'damping': 'solver_damping',
                        'debug': 'simulator_debug',
                        'epsilon': 'solver_epsilon',
                        'height': 'grid_height',
                        'hotspots': 'grid_hotspots',
                        'in_path': 'input_location',
                        'max_iterations': 'solver_max_iterations',
                        'out_path': 'output_location',
                        'policy': 'cache_policy',
                        'q_map': 'rnd_q_map',
                        'replications': 'sweep_replications',
                        'requests': 'sweep_requests',
                        'seed': 'random_seed',
                        'warmup': 'simulator_warmup',
                        'width': 'grid_width'
                    }

    if override_dict is not None:
        if override_dict.get(name, None) is not None:
            return override_dict[name]
        elif name in name_mappings and override_dict.get(name_mappings[name], None) is not None:
            return override_dict[name_mappings[name]]

    value = GetParameter(name, config_file)
    if value is not None:
        return value
    elif name in name_mappings:
        return GetParameter(name_mappings[name], config_file)

    return None


def GetParameter(param, config_file=None, use_provided=True, use_cwd=True,
                 use_environ=True):
    """
    Retrieve a parameter from the simcache configuration file. This function
    looks for the configuration file as follows (returning the first file found)

    - If a file is provided to the function, check that file
    - If there is a simcache_config.yaml in the current directory, check that file
    - If there is a simcache_config environment variable, check that file
    - Check the internal data/simcache_config.yaml file.

    A file which does not contain the parameter is skipped, and the search
    continues further down the list.

    Parameters
    ----------
    param : str
        Name of parameter

    config_file : str, default None
        Supplied configuration file

    Returns
    -------
    value : obj
        The value found (None if no value is found)
    """
    file_used = "local"
    settings = None
    conf_file = None
    local_dir = os.path.dirname(os.path.abspath(__file__))
    local_config_file = os.path.join(local_dir, "..", "data", "simcache_config.yaml")
    local_config = os.path.normpath(local_config_file)
    cwd_config = os.path.join(os.getcwd(), "simcache_config.yaml")
    env_config = os.environ.get('simcache_config', None)
    if use_environ and env_config is not None:
        if not os.path.isfile(env_config):
            env_config = os.path.join(env_config, "simcache_config.yaml")

    if use_provided and config_file is not None and os.path.isfile(config_file):
        conf_file = config_file
        file_used = "provided"
    elif use_cwd and os.path.isfile(cwd_config):
        conf_file = cwd_config
        file_used = "cwd"
    elif use_environ and env_config is not None and os.path.isfile(env_config):
        conf_file = env_config
        file_used = "environ"
    elif os.path.isfile(local_config):
        conf_file = local_config

    if conf_file is not None:
        with open(conf_file, 'r') as config:
            settings = yaml.safe_load(config)
    if settings is None:
        settings = {}

    if param in settings:
        return TranslateParameter(param, settings[param])
    elif file_used == "provided":
        # Try without the supplied config file in case it doesn't include
        #   the full set of parameters
        return GetParameter(param, use_provided=False)
    elif file_used == "cwd":
        return GetParameter(param, use_provided=False, use_cwd=False)
    elif file_used == "environ":
        return GetParameter(param, use_provided=False, use_cwd=False,
                            use_environ=False)

    return None


def TranslateParameter(param, value):
    """
    Check if a parameter is in a dictionary of special values and, if so,
    substitute in the proper value.

    Parameters
    ----------
    param : str
        Name of parameter

    value : obj
        Supplied value

    Returns
    -------
    value : obj
        The value as translated
    """
    translations = {
                    'input_location': {'$CWD': os.getcwd},
                    'output_location': {'$CWD': os.getcwd}
                   }

    if param in translations:
        if value in translations[param]:
            if callable(translations[param][value]):
                return translations[param][value]()
            return translations[param][value]
        return value

    return value


def ResolvePath(file_name, directory):
    """
    Return file_name unchanged if it is an absolute path, otherwise join it to
    directory. Raises FileNotFoundError for paths that do not exist.
    """
    if os.path.isabs(file_name) or directory is None:
        path = file_name
    else:
        path = os.path.join(directory, file_name)
    if not os.path.exists(path) and os.path.exists(file_name):
        path = file_name
    if not os.path.exists(path):
        raise FileNotFoundError("File {} does not exist.".format(path))
    return path
