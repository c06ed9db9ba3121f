#pragma once

#include "muldecide/arith.hpp"
#include "muldecide/corpus.hpp"
#include "muldecide/crt.hpp"
#include "muldecide/errors.hpp"
#include "muldecide/formula.hpp"
#include "muldecide/json_io.hpp"
#include "muldecide/parser.hpp"
#include "muldecide/qe.hpp"
#include "muldecide/rsystem.hpp"
#include "muldecide/semantics.hpp"
