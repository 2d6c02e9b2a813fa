#pragma once

#define DCSL_VERSION "0.1.0"
