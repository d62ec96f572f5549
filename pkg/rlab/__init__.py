"""rigidity-lab's package.

Exact-arithmetic checks of codimension counts for singular-hypersurface loci,
resolution-graph multiplicity recursions and the exclusion of supermaximal
singularities. `rigiditylab.py` at the repo root is just a launch shim
(`from rlab.main import main`). Modules are layered bottom-up (the import graph
is a DAG):

    ids, errors, multipoly       leaves
    log, jobs                    leaves
    exact                        leaf
    codim, respath               -> ids, errors
    polyspace                    -> exact, codim, errors
    excluder                     -> respath, multipoly, ids, errors
    schema                       -> respath, excluder, ids, errors  (JSON documents)
    config                       -> schema, errors
    app                          -> config, log                (the App struct)
    report                       -> ids
    commands                     -> everything above
    main                         -> app, commands

The library layers (exact .. excluder) are pure: they raise or return values
and never log. State for a run is reached through an injected `App` struct
(`self.app` / the `app` argument), not a global.
"""

__version__ = "0.1.0"
