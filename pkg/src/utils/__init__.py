# Utils package for verdict rules, configuration and the run registry
