#pragma once

#include "seplearn/automata.hpp"
#include "seplearn/bigint.hpp"
#include "seplearn/bits.hpp"
#include "seplearn/ctl.hpp"
#include "seplearn/driver.hpp"
#include "seplearn/engine.hpp"
#include "seplearn/error.hpp"
#include "seplearn/formula.hpp"
#include "seplearn/io.hpp"
#include "seplearn/kripke.hpp"
#include "seplearn/lasso.hpp"
#include "seplearn/ltl.hpp"
#include "seplearn/ltlp.hpp"
#include "seplearn/ml.hpp"
#include "seplearn/oracle.hpp"
#include "seplearn/random.hpp"
#include "seplearn/samples.hpp"
#include "seplearn/signature.hpp"
#include "seplearn/text.hpp"
