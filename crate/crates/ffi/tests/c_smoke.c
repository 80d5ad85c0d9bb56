#include <stdio.h>
#include <string.h>
#include "qstr.h"

int main(void) {
    QstrCalculus *ia = NULL;
    QstrNetwork *net = NULL, *scenario = NULL;
    QstrVerdict verdict;
    char *text = NULL;

    if (qstr_calculus_new("IA", &ia) != QSTR_STATUS_OK) return 1;
    if (qstr_network_new(ia, 3, &net) != QSTR_STATUS_OK) return 2;
    qstr_network_set(net, 0, 1, "m");
    qstr_network_set(net, 1, 2, "b m");
    if (qstr_network_scenario(net, "SIA", &verdict, &scenario) != QSTR_STATUS_OK) return 3;
    if (verdict != QSTR_VERDICT_CONSISTENT || scenario == NULL) return 4;
    if (qstr_network_get(scenario, 0, 2, &text) != QSTR_STATUS_OK) return 5;
    printf("0 2 : %s\n", text);
    qstr_string_free(text);

    if (qstr_calculus_new("nope", &ia) != QSTR_STATUS_UNKNOWN_NAME) return 6;
    if (strstr(qstr_last_error(), "nope") == NULL) return 7;

    qstr_network_free(scenario);
    qstr_network_free(net);
    qstr_calculus_free(ia);
    return 0;
}
