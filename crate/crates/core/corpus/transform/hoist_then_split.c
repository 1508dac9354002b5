void f(int n, int c) {
    int a[16];
    int b[16];
    int t;
    t = 0;
    for (int i = 0; i < n; i++) {
        t = c * c;
        a[i] = t + i;
        b[i] = b[i] + t;
    }
}
