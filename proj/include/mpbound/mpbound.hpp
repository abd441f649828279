#pragma once

#include "mpbound/agreement.hpp"
#include "mpbound/certificate.hpp"
#include "mpbound/circuits.hpp"
#include "mpbound/embed.hpp"
#include "mpbound/error.hpp"
#include "mpbound/families.hpp"
#include "mpbound/field.hpp"
#include "mpbound/io.hpp"
#include "mpbound/lemma_suite.hpp"
#include "mpbound/matcodes.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/rank_oracle.hpp"
#include "mpbound/rng.hpp"
#include "mpbound/search.hpp"
