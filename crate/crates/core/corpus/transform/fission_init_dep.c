void f(int n, int k) {
    int a[16];
    int b[16];
    for (int i = k; i < n; i++) {
        a[i] = k;
        b[i] = i;
    }
    k = k + 1;
}
