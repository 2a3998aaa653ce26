from pflab.harness._string import (
    longest_common_prefix,
    longest_common_suffix,
)


def test_harness_string_longest_common_prefix():
    assert longest_common_prefix(['kink-max', 'kink-order']) == 'kink-'
    assert longest_common_prefix(['sweep', 'constant', 'bump']) == ''
    assert longest_common_prefix(['trend']) == 'trend'
    assert longest_common_prefix([]) == ''


def test_harness_string_longest_common_suffix():
    assert longest_common_suffix(['order-plane', 'max-plane']) == '-plane'
    assert longest_common_suffix(['estimate-ramp', 'estimate-identity']) == ''
    assert longest_common_suffix([]) == ''
