void f(int n) {
    int a[n];
    int s;
    s = 0;
    for (int i = 0; i < n; i++) {
        a[i] = i;
        s = s + a[i];
    }
}
