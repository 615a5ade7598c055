from .catalog import CATALOG, DSL, DSTL, INVALID, Schema, catalog, lookup
from .kernel import (BridgeReport, LemmaLibrary, ProofResult, bundled_library, check_file,
                     check_proof, register_lemma, soundness_bridge)
from .match import normal
from .script import ProofScript, parse_proofs
from .mutate import Mutation, MutationOutcome, mutations, run_mutations
