#pragma once

#include "formopt/campaign.hpp"
#include "formopt/composition.hpp"
#include "formopt/config.hpp"
#include "formopt/gp.hpp"
#include "formopt/kde.hpp"
#include "formopt/nbi.hpp"
#include "formopt/oracle.hpp"
#include "formopt/report.hpp"
#include "formopt/runlog.hpp"
#include "formopt/toy.hpp"
#include "formopt/utility.hpp"
